// Generated by tools/embed_data.py from data/*.json. Do not edit.
#pragma once

#include <string_view>

namespace engage::data {

inline constexpr std::string_view engagement_items = R"json({
  "version": 1,
  "scale": {
    "min": 1,
    "max": 7
  },
  "instruction": "Please use this 7-point rating scale to share your impressions of the conversation with your partner.",
  "items": [
    {
      "item_id": "Q1",
      "statement": "I found this conversation to be interesting.",
      "negatively_coded": false
    },
    {
      "item_id": "Q2",
      "statement": "I enjoyed talking with my conversation partner.",
      "negatively_coded": false
    },
    {
      "item_id": "Q3",
      "statement": "The conversation flowed smoothly.",
      "negatively_coded": false
    },
    {
      "item_id": "Q4",
      "statement": "I felt comfortable during the conversation.",
      "negatively_coded": false
    },
    {
      "item_id": "Q5",
      "statement": "I felt like my conversation partner really listened to me.",
      "negatively_coded": false
    },
    {
      "item_id": "Q6",
      "statement": "The conversation felt awkward at times.",
      "negatively_coded": true
    },
    {
      "item_id": "Q7",
      "statement": "I would like to talk with my conversation partner again.",
      "negatively_coded": false
    },
    {
      "item_id": "Q8",
      "statement": "My partner tended to make eye contact during the conversation.",
      "negatively_coded": false
    },
    {
      "item_id": "Q9",
      "statement": "I felt bored during parts of the conversation.",
      "negatively_coded": true
    },
    {
      "item_id": "Q10",
      "statement": "My conversation partner seemed like a warm person.",
      "negatively_coded": false
    },
    {
      "item_id": "Q11",
      "statement": "My conversation partner seemed interested in what I had to say.",
      "negatively_coded": false
    },
    {
      "item_id": "Q12",
      "statement": "I became irritated with my partner at some points in the conversation.",
      "negatively_coded": true
    },
    {
      "item_id": "Q13",
      "statement": "I felt that my partner and I had a lot in common.",
      "negatively_coded": false
    },
    {
      "item_id": "Q14",
      "statement": "My partner and I laughed during our interaction.",
      "negatively_coded": false
    },
    {
      "item_id": "Q15",
      "statement": "I was paying close attention to what my partner said.",
      "negatively_coded": false
    },
    {
      "item_id": "Q16",
      "statement": "My conversation partner was quite sensitive.",
      "negatively_coded": false
    },
    {
      "item_id": "Q17",
      "statement": "I would trust my conversation partner with sensitive information.",
      "negatively_coded": false
    },
    {
      "item_id": "Q18",
      "statement": "I felt distracted during the conversation.",
      "negatively_coded": true
    },
    {
      "item_id": "Q19",
      "statement": "My conversation partner seemed friendly.",
      "negatively_coded": false
    },
    {
      "item_id": "Q20",
      "statement": "I felt that the conversation was forced.",
      "negatively_coded": true
    },
    {
      "item_id": "Q21",
      "statement": "My partner dominated the conversation.",
      "negatively_coded": true
    },
    {
      "item_id": "Q22",
      "statement": "I was able to express myself during the conversation.",
      "negatively_coded": false
    },
    {
      "item_id": "Q23",
      "statement": "My conversation partner seemed intelligent.",
      "negatively_coded": false
    },
    {
      "item_id": "Q24",
      "statement": "I felt a sense of connection with my conversation partner.",
      "negatively_coded": false
    },
    {
      "item_id": "Q25",
      "statement": "The conversation went on too long.",
      "negatively_coded": true
    },
    {
      "item_id": "Q26",
      "statement": "My partner seemed to understand my point of view.",
      "negatively_coded": false
    },
    {
      "item_id": "Q27",
      "statement": "I felt self-conscious during the conversation.",
      "negatively_coded": true
    },
    {
      "item_id": "Q28",
      "statement": "My conversation partner was easy to talk to.",
      "negatively_coded": false
    },
    {
      "item_id": "Q29",
      "statement": "I was interested in learning more about my partner.",
      "negatively_coded": false
    },
    {
      "item_id": "Q30",
      "statement": "There were uncomfortable silences during the conversation.",
      "negatively_coded": true
    },
    {
      "item_id": "Q31",
      "statement": "My partner seemed to enjoy talking with me.",
      "negatively_coded": false
    },
    {
      "item_id": "Q32",
      "statement": "I shared personal information with my partner.",
      "negatively_coded": false
    },
    {
      "item_id": "Q33",
      "statement": "My partner shared personal information with me.",
      "negatively_coded": false
    },
    {
      "item_id": "Q34",
      "statement": "I felt that my partner was being genuine.",
      "negatively_coded": false
    },
    {
      "item_id": "Q35",
      "statement": "My conversation partner seemed nervous.",
      "negatively_coded": true
    },
    {
      "item_id": "Q36",
      "statement": "I would describe the conversation as pleasant.",
      "negatively_coded": false
    },
    {
      "item_id": "Q37",
      "statement": "I felt that my partner respected my opinions.",
      "negatively_coded": false
    },
    {
      "item_id": "Q38",
      "statement": "I found it difficult to think of things to say.",
      "negatively_coded": true
    },
    {
      "item_id": "Q39",
      "statement": "My partner asked me questions about myself.",
      "negatively_coded": false
    },
    {
      "item_id": "Q40",
      "statement": "I asked my partner questions about themselves.",
      "negatively_coded": false
    },
    {
      "item_id": "Q41",
      "statement": "The conversation was engaging.",
      "negatively_coded": false
    },
    {
      "item_id": "Q42",
      "statement": "My conversation partner seemed distant.",
      "negatively_coded": true
    },
    {
      "item_id": "Q43",
      "statement": "I felt that my partner and I got along well.",
      "negatively_coded": false
    },
    {
      "item_id": "Q44",
      "statement": "I was enthusiastic during the conversation.",
      "negatively_coded": false
    },
    {
      "item_id": "Q45",
      "statement": "My partner was enthusiastic during the conversation.",
      "negatively_coded": false
    },
    {
      "item_id": "Q46",
      "statement": "I felt like I was doing most of the talking.",
      "negatively_coded": true
    },
    {
      "item_id": "Q47",
      "statement": "My conversation partner made a lot of eye contact.",
      "negatively_coded": false
    },
    {
      "item_id": "Q48",
      "statement": "I felt that the conversation was meaningful.",
      "negatively_coded": false
    },
    {
      "item_id": "Q49",
      "statement": "My conversation partner seemed sincere.",
      "negatively_coded": false
    },
    {
      "item_id": "Q50",
      "statement": "I felt that time passed quickly during the conversation.",
      "negatively_coded": false
    },
    {
      "item_id": "Q51",
      "statement": "I would be interested in being friends with my conversation partner.",
      "negatively_coded": false
    },
    {
      "item_id": "Q52",
      "statement": "I felt uneasy around my conversation partner.",
      "negatively_coded": true
    },
    {
      "item_id": "Q53",
      "statement": "Overall, I was satisfied with the conversation.",
      "negatively_coded": false
    }
  ]
}
)json";

inline constexpr std::string_view big_five_inventory = R"json({
  "version": 1,
  "scale": {
    "min": 1,
    "max": 5
  },
  "statements": [
    "I see myself as someone who is talkative.",
    "I see myself as someone who tends to find fault with others.",
    "I see myself as someone who does a thorough job.",
    "I see myself as someone who is depressed, blue.",
    "I see myself as someone who is original, comes up with new ideas.",
    "I see myself as someone who is reserved.",
    "I see myself as someone who is helpful and unselfish with others.",
    "I see myself as someone who can be somewhat careless.",
    "I see myself as someone who is relaxed, handles stress well.",
    "I see myself as someone who is curious about many different things.",
    "I see myself as someone who is full of energy.",
    "I see myself as someone who starts quarrels with others.",
    "I see myself as someone who is a reliable worker.",
    "I see myself as someone who can be tense.",
    "I see myself as someone who is ingenious, a deep thinker.",
    "I see myself as someone who generates a lot of enthusiasm.",
    "I see myself as someone who has a forgiving nature.",
    "I see myself as someone who tends to be disorganized.",
    "I see myself as someone who worries a lot.",
    "I see myself as someone who has an active imagination.",
    "I see myself as someone who tends to be quiet.",
    "I see myself as someone who is generally trusting.",
    "I see myself as someone who tends to be lazy.",
    "I see myself as someone who is emotionally stable, not easily upset.",
    "I see myself as someone who is inventive.",
    "I see myself as someone who has an assertive personality.",
    "I see myself as someone who can be cold and aloof.",
    "I see myself as someone who perseveres until the task is finished.",
    "I see myself as someone who can be moody.",
    "I see myself as someone who values artistic, aesthetic experiences.",
    "I see myself as someone who is sometimes shy, inhibited.",
    "I see myself as someone who is considerate and kind to almost everyone.",
    "I see myself as someone who does things efficiently.",
    "I see myself as someone who remains calm in tense situations.",
    "I see myself as someone who prefers work that is routine.",
    "I see myself as someone who is outgoing, sociable.",
    "I see myself as someone who is sometimes rude to others.",
    "I see myself as someone who makes plans and follows through with them.",
    "I see myself as someone who gets nervous easily.",
    "I see myself as someone who likes to reflect, play with ideas.",
    "I see myself as someone who has few artistic interests.",
    "I see myself as someone who likes to cooperate with others.",
    "I see myself as someone who is easily distracted.",
    "I see myself as someone who is sophisticated in art, music, or literature."
  ]
}
)json";

inline constexpr std::string_view beliefs_instrument = R"json({
  "version": 1,
  "instruction": "Please select the answer which most represents your beliefs.",
  "topics": [
    {
      "topic": "Environmental Protection",
      "options": [
        "I am very much against environmental protection.",
        "I am against environmental protection.",
        "I am mildly against environmental protection.",
        "I am mildly in favor of environmental protection.",
        "I am in favor of environmental protection.",
        "I am very much in favor of environmental protection."
      ]
    },
    {
      "topic": "Careers for Women",
      "options": [
        "I am very much against women pursuing careers.",
        "I am against women pursuing careers.",
        "I am mildly against women pursuing careers.",
        "I am mildly in favor of women pursuing careers.",
        "I am in favor of women pursuing careers.",
        "I am very much in favor of women pursuing careers."
      ]
    },
    {
      "topic": "Belief in God",
      "options": [
        "I strongly believe that there is a God.",
        "I believe there is a God.",
        "I feel that perhaps there is a God.",
        "I feel that perhaps there is no God.",
        "I believe there is no God.",
        "I strongly believe there is no God."
      ]
    },
    {
      "topic": "Ranking of Schools",
      "options": [
        "I am very much against the ranking of schools.",
        "I am against the ranking of schools.",
        "I am mildly against the ranking of schools.",
        "I am mildly in favor of the ranking of schools.",
        "I am in favor of the ranking of schools.",
        "I am very much in favor of the ranking of schools."
      ]
    },
    {
      "topic": "Abortion",
      "options": [
        "I am very much against abortion.",
        "I am against abortion.",
        "I am mildly against abortion.",
        "I am mildly in favor of abortion.",
        "I am in favor of abortion.",
        "I am very much in favor of abortion."
      ]
    },
    {
      "topic": "Death Penalty",
      "options": [
        "I am very much against the death penalty.",
        "I am against the death penalty.",
        "I am mildly against the death penalty.",
        "I am mildly in favor of the death penalty.",
        "I am in favor of the death penalty.",
        "I am very much in favor of the death penalty."
      ]
    },
    {
      "topic": "Gay Marriage",
      "options": [
        "I am very much against gay marriage.",
        "I am against gay marriage.",
        "I am mildly against gay marriage.",
        "I am mildly in favor of gay marriage.",
        "I am in favor of gay marriage.",
        "I am very much in favor of gay marriage."
      ]
    },
    {
      "topic": "Money",
      "options": [
        "I strongly believe that money is one of the most important things in life.",
        "I believe that money is one of the most important things in life.",
        "I feel perhaps that money is one of the most important things in life.",
        "I feel perhaps that money is not one of the most important things in life.",
        "I believe that money is not one of the most important things in life.",
        "I strongly believe that money is not one of the most important things in life."
      ]
    },
    {
      "topic": "Divorce",
      "options": [
        "I am very much against divorce.",
        "I am against divorce.",
        "I am mildly against divorce.",
        "I am mildly in favor of divorce.",
        "I am in favor of divorce.",
        "I am very much in favor of divorce."
      ]
    },
    {
      "topic": "Smoking",
      "options": [
        "I am very much against smoking in public places like bars.",
        "I am against smoking in public places like bars.",
        "I am mildly against smoking in public places like bars.",
        "I am mildly in favor of smoking in public places like bars.",
        "I am in favor of smoking in public places like bars.",
        "I am very much in favor of smoking in public places like bars."
      ]
    },
    {
      "topic": "Spanking Children",
      "options": [
        "In general, I am very much in favor of spanking children.",
        "In general, I am in favor of spanking children.",
        "In general, I am mildly in favor of spanking children.",
        "In general, I am mildly against spanking children.",
        "In general, I am against spanking children.",
        "In general, I am very much against spanking children."
      ]
    },
    {
      "topic": "Climate Change",
      "options": [
        "I strongly believe that climate change has not been accelerated by humans.",
        "I believe that climate change has not been accelerated by humans.",
        "I mildly believe that climate change has not been accelerated by humans.",
        "I mildly believe that climate change has been accelerated by humans.",
        "I believe climate change has been accelerated by humans.",
        "I strongly believe that climate change has been accelerated by humans."
      ]
    },
    {
      "topic": "Health Care",
      "options": [
        "I strongly believe that humans are not entitled to health care.",
        "I believe that humans are not entitled to health care.",
        "I mildly believe that humans are not entitled to health care.",
        "I mildly believe that humans are entitled to health care.",
        "I believe that humans are entitled to health care.",
        "I strongly believe that humans are entitled to health care."
      ]
    },
    {
      "topic": "Social Safety Net",
      "options": [
        "I strongly believe the government should not provide funds to support individuals' welfare.",
        "I believe the government should not provide funds to support individuals' welfare.",
        "I mildly believe the government should not provide funds to support individuals' welfare.",
        "I mildly believe the government should provide funds to support individuals' welfare.",
        "I believe the government should provide funds to support individuals' welfare.",
        "I strongly believe the government should provide funds to support individuals' welfare."
      ]
    },
    {
      "topic": "College",
      "options": [
        "I strongly believe the government should not pay for college students' tuition.",
        "I believe the government should not pay for college students' tuition.",
        "I mildly believe the government should not pay for college students' tuition.",
        "I mildly believe the government should pay for college students' tuition.",
        "I believe the government should pay for college students' tuition.",
        "I strongly believe the government should pay for college students' tuition."
      ]
    },
    {
      "topic": "[Local University]",
      "options": [
        "I strongly believe that [local university] is a welcoming university environment.",
        "I believe that [local university] is a welcoming university environment.",
        "I mildly believe that [local university] is a welcoming university environment.",
        "I mildly believe that [local university] is not a welcoming university environment.",
        "I believe that [local university] is not a welcoming university environment.",
        "I strongly believe that [local university] is not a welcoming university environment."
      ]
    }
  ]
}
)json";

inline constexpr std::string_view au_emotion_table = R"json({
  "version": 1,
  "presence_threshold": 1.0,
  "rules": [
    {
      "emotion": "happy",
      "require": [
        "AU06",
        "AU12"
      ],
      "forbid": []
    },
    {
      "emotion": "fear",
      "require": [
        "AU01",
        "AU02",
        "AU04",
        "AU05",
        "AU07",
        "AU20",
        "AU26"
      ],
      "forbid": []
    },
    {
      "emotion": "surprise",
      "require": [
        "AU01",
        "AU02",
        "AU05",
        "AU26"
      ],
      "forbid": []
    },
    {
      "emotion": "anger",
      "require": [
        "AU04",
        "AU05",
        "AU07",
        "AU23"
      ],
      "forbid": []
    },
    {
      "emotion": "disgust",
      "require": [
        "AU09",
        "AU15"
      ],
      "forbid": []
    },
    {
      "emotion": "sad",
      "require": [
        "AU01",
        "AU04",
        "AU15"
      ],
      "forbid": []
    },
    {
      "emotion": "contempt",
      "require": [
        "AU14"
      ],
      "forbid": [
        "AU06"
      ]
    }
  ]
}
)json";

inline constexpr std::string_view emotion_descriptions = R"json({
  "version": 1,
  "descriptions": {
    "happy": "a smiling mouth, raised cheeks",
    "sad": "drooping upper eyelids, lowered corners of the mouth, and raised inner eyebrows",
    "surprise": "widely opened eyes, raised eyebrows, and a dropped jaw",
    "fear": "raised and drawn-together eyebrows, widened eyes, and lips stretched sideways",
    "anger": "lowered and drawn-together eyebrows, glaring eyes, and tightly pressed lips",
    "disgust": "a wrinkled nose, a raised upper lip, and lowered eyebrows",
    "contempt": "one corner of the mouth tightened and raised, and a slight sneer",
    "neutral": "relaxed facial muscles, a straight mouth, a smooth forehead, and unremarkable eyebrows"
  }
}
)json";

}  // namespace engage::data
